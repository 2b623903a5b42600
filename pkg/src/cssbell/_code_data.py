"""Embedded code tables.

4.8.8 triangular color codes: each entry is ``(n_qubits, faces)`` where every
face supports one X and one Z generator.  For d = 5 and d = 7 the qubits are
numbered by lattice row from the bottom edge, left to right within a row, so
qubits ``0 .. d-1`` form the bottom boundary.  The d = 3 table uses the
Steane numbering with qubits 0, 1, 2 on one boundary.
"""

COLOR_488_FACES = {
    3: (7, ((0, 2, 4, 6), (1, 2, 5, 6), (3, 4, 5, 6))),
    5: (
        17,
        (
            (5, 6, 9, 10),
            (7, 8, 11, 12),
            (13, 14, 15, 16),
            (1, 2, 5, 6),
            (3, 4, 7, 8),
            (0, 1, 5, 9),
            (2, 3, 6, 7, 10, 11, 13, 14),
            (11, 12, 14, 16),
        ),
    ),
    7: (
        31,
        (
            (7, 8, 13, 14),
            (9, 10, 15, 16),
            (11, 12, 17, 18),
            (19, 20, 23, 24),
            (21, 22, 25, 26),
            (27, 28, 29, 30),
            (1, 2, 7, 8),
            (3, 4, 9, 10),
            (5, 6, 11, 12),
            (0, 1, 7, 13),
            (2, 3, 8, 9, 14, 15, 19, 20),
            (4, 5, 10, 11, 16, 17, 21, 22),
            (15, 16, 20, 21, 24, 25, 27, 28),
            (17, 18, 22, 26),
            (23, 24, 27, 29),
        ),
    ),
}

# lattice coordinates (x, y) of the qubits, same numbering as above
COLOR_488_COORDS = {
    3: None,
    5: ((0, 1), (2, 1), (6, 1), (8, 1), (12, 1), (3, 2), (5, 2), (9, 2), (11, 2), (3, 4), (5, 4), (9, 4), (11, 4), (6, 5), (8, 5), (6, 7), (8, 7)),
    7: ((0, 1), (2, 1), (6, 1), (8, 1), (12, 1), (14, 1), (18, 1), (3, 2), (5, 2), (9, 2), (11, 2), (15, 2), (17, 2), (3, 4), (5, 4), (9, 4), (11, 4), (15, 4), (17, 4), (6, 5), (8, 5), (12, 5), (14, 5), (6, 7), (8, 7), (12, 7), (14, 7), (9, 8), (11, 8), (9, 10), (11, 10)),
}

COLOR_488_BOUNDARY = {3: (0, 1, 2), 5: tuple(range(5)), 7: tuple(range(7))}

# rref check matrix of the cyclic [23, 12, 7] Golay code, g(x) = 1+x^2+x^4+x^5+x^6+x^10+x^11
GOLAY_CHECK_ROWS = (
    "10000000000111110010010",
    "01000000000011111001001",
    "00100000000110001110110",
    "00010000000011000111011",
    "00001000000110010001111",
    "00000100000100111010101",
    "00000010000101101111000",
    "00000001000010110111100",
    "00000000100001011011110",
    "00000000010000101101111",
    "00000000001111100100101",
)
