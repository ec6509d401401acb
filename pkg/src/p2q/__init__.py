"""Groups of order p²q, their automorphism groups, and checks of the predicted structures."""
