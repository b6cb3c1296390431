""" Binary-reflected Gray codes.

Consecutive code words differ in exactly one bit, cyclically, so that
walking the codes of width k visits every corner of the Boolean cube {0,1}^k
one edge at a time. The space-filling curve in ManifoldLab.Manifold is
strung along such a walk.

Bit strings are numpy arrays of uint8 zeros and ones, most significant bit
first, so that gray(2, 3) is array([0, 1, 1]):

    >>> [bitstring(gray(i, 3)) for i in range(8)]
    ['000', '001', '011', '010', '110', '111', '101', '100']

Code indexes are circular: code_index(i, k) wraps any integer into
[0, 2^k), and the curve uses it to find neighbors of the first and last
segment.
"""

import numpy

from .Core import DomainError

MAX_WIDTH = 30

def _check_width(k):
    if k < 1 or k > MAX_WIDTH:
        raise DomainError('Gray code width must be between 1 and %d, not %s' % (MAX_WIDTH, k))

def code_index(i, k):
    """ Wrap an integer into the circular index range [0, 2^k).
    """
    _check_width(k)
    return int(i) % (1 << k)

def to_bits(value, k):
    """ Unpack an integer into k bits, most significant first.
    """
    shifts = numpy.arange(k - 1, -1, -1)
    return ((int(value) >> shifts) & 1).astype(numpy.uint8)

def from_bits(bits):
    """ Pack bits, most significant first, into an integer.
    """
    value = 0
    for bit in bits:
        value = (value << 1) | int(bit)
    return value

def gray(i, k):
    """ Return the width-k binary-reflected Gray code word with index i.
    """
    _check_width(k)

    if i < 0 or i >= (1 << k):
        raise DomainError('Gray code index %s is outside [0, 2^%d)' % (i, k))

    return to_bits(int(i) ^ (int(i) >> 1), k)

def gray_inverse(b):
    """ Return the index whose Gray code word is b.
    """
    b = as_bitstring(b)
    n = from_bits(b)

    # prefix XOR from the top bit down
    mask = n >> 1
    while mask:
        n ^= mask
        mask >>= 1

    return n

def gray_table(k):
    """ Return every width-k code word in index order as a (2^k, k) array.
    """
    _check_width(k)

    i = numpy.arange(1 << k, dtype=numpy.int64)
    g = i ^ (i >> 1)
    shifts = numpy.arange(k - 1, -1, -1, dtype=numpy.int64)

    return ((g[:, None] >> shifts[None, :]) & 1).astype(numpy.uint8)

def flip_positions(k):
    """ Return, for each index i, the bit position flipped between code i and i+1 (mod 2^k).
    """
    table = gray_table(k)
    following = numpy.roll(table, -1, axis=0)

    return numpy.argmax(table != following, axis=1)

def expand_codeword(b, delta_r, ambient):
    """ Repeat each bit of b delta_r times, then pad with zeros to ambient coordinates.
    """
    b = as_bitstring(b)

    if delta_r < 1:
        raise DomainError('Repeat count must be at least 1, not %s' % delta_r)

    if ambient < len(b) * delta_r:
        raise DomainError('Ambient dimension %d is too small for %d bits repeated %d times'
                          % (ambient, len(b), delta_r))

    expanded = numpy.zeros(int(ambient), dtype=numpy.uint8)
    expanded[:len(b) * delta_r] = numpy.repeat(b, delta_r)

    return expanded

def hamming(a, b):
    """ Count the coordinates where two equal-length bit strings differ.
    """
    a, b = as_bitstring(a), as_bitstring(b)

    if a.shape != b.shape:
        raise DomainError('Cannot compare bit strings of length %d and %d' % (len(a), len(b)))

    return int(numpy.count_nonzero(a != b))

def as_bitstring(bits):
    """ Coerce a sequence or a string like "1011" into a validated bit array.
    """
    if isinstance(bits, str):
        bits = [int(c) for c in bits]

    array = numpy.asarray(bits)

    if array.ndim != 1 or array.size == 0:
        raise DomainError('A bit string is a non-empty one-dimensional sequence')

    if not numpy.all((array == 0) | (array == 1)):
        raise DomainError('Bit strings hold only zeros and ones: %s' % array)

    return array.astype(numpy.uint8)

def bitstring(bits):
    """ Format a bit array as a compact string.
    """
    return ''.join('%d' % bit for bit in bits)
