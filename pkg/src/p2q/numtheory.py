"""Residue arithmetic shared by the catalog and the matrix code."""
from sympy.ntheory import factorint, isprime, n_order, primitive_root


def is_prime(n):
    return isprime(int(n))


def least_primitive_root(n):
    return int(primitive_root(int(n)))


def mult_order(a, n):
    return int(n_order(int(a) % int(n), int(n)))


def unit_of_order(order, modulus):
    """``g^((phi)/order)`` for the least primitive root ``g`` of ``modulus``.

    ``modulus`` is a prime or a prime square, so its unit group is cyclic
    (for 4 as well). Deterministic: the same unit every call.
    """
    modulus = int(modulus)
    phi = _phi(modulus)
    if phi % order:
        raise ValueError(f"no unit of order {order} modulo {modulus}")
    if modulus == 2:
        return 1
    g = least_primitive_root(modulus)
    return pow(g, phi // order, modulus)


def _phi(n):
    result = n
    for r in factorint(n):
        result = result // r * (r - 1)
    return result


def p2q_factor(n):
    """``(p, q)`` with ``n = p*p*q`` for distinct primes, else ``None``."""
    f = factorint(int(n))
    if len(f) != 2:
        return None
    (a, ea), (b, eb) = sorted(f.items())
    if (ea, eb) == (2, 1):
        return a, b
    if (ea, eb) == (1, 2):
        return b, a
    return None


def discrete_log(x, base, modulus):
    """Least ``e >= 0`` with ``base^e = x`` mod ``modulus`` (brute force)."""
    x %= modulus
    acc = 1
    for e in range(modulus):
        if acc == x:
            return e
        acc = acc * base % modulus
    raise ValueError(f"{x} is not a power of {base} modulo {modulus}")
