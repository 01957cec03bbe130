"""Hand-checked frozen fixtures shared by the unit and acceptance tests.

All matrices are in the text format of BoolMatrix.from_text: h lines of h
characters from {0,1}, row i on line i, column j at character j.
"""

# Chain matrices for h = 5 (U = 10, N = 15), frozen from a worked example.
CHAIN_H5 = {
    0: "10000\n01000\n00100\n00010\n00001\n",
    6: "10001\n01011\n00111\n00011\n00001\n",
    10: "11111\n01111\n00111\n00011\n00001\n",
    11: "11111\n01111\n00111\n00011\n00011\n",
    12: "11111\n01111\n00111\n00111\n00111\n",
    14: "11111\n11111\n11111\n11111\n11111\n",
}

# Auxiliary increment matrices for h = 5, same source.
E_H5 = {
    6: "00000\n00010\n00000\n00000\n00000\n",
    8: "00000\n00100\n00000\n00000\n00000\n",
}

E_PRIME_H5 = {
    8: "00000\n00111\n00000\n00000\n00000\n",
}

D_H5 = {
    11: "00000\n00000\n00000\n00000\n00010\n",
    12: "00000\n00000\n00000\n00100\n00100\n",
}

D_PRIME_H5 = {
    12: "00111\n00111\n00111\n00111\n00111\n",
}
