"""Reference net tables, transcribed as label pairs ``mn`` (label = m*d + n).

Each table is a list of rows, each row a list of cells, each cell a string of
space-separated two-digit pairs in reference order.
"""

NET_D2 = [
    ["00 01", "10 11"],
    ["00 10", "01 11"],
    ["00 11", "01 10"],
]
QUESTIONS_D2 = ["m = b?", "n = b?", "m + n = b?"]

NET_D3 = [
    ["00 01 02", "10 11 12", "20 21 22"],
    ["00 10 20", "01 11 21", "02 12 22"],
    ["00 11 22", "01 12 20", "02 10 21"],
    ["00 12 21", "01 10 22", "02 11 20"],
]
QUESTIONS_D3 = ["m = b?", "n = b?", "n = m + b?", "n = 2m + b?"]

NET_D4 = [
    ["00 01 02 03", "10 11 12 13", "20 21 22 23", "30 31 32 33"],
    ["00 10 20 30", "01 11 21 31", "02 12 22 32", "03 13 23 33"],
    ["00 11 22 33", "01 10 23 32", "02 13 20 31", "03 12 21 30"],
    ["00 12 23 31", "01 13 22 30", "02 10 21 33", "03 11 20 32"],
    ["00 13 21 32", "01 12 20 33", "02 11 23 30", "03 10 22 31"],
]

# The same d=4 table with every label mn written as two stacked bit pairs:
# upper line (m1 n1), lower line (m2 n2); m decomposed in the basis (w, 1),
# n in its dual basis (1, w+1).
NET_D4_BITS = [
    ("00 01 01 00 | 00 01 01 00 | 10 11 11 10 | 10 11 11 10",
     "00 00 01 01 | 10 10 11 11 | 00 00 01 01 | 10 10 11 11"),
    ("00 00 10 10 | 01 01 11 11 | 01 01 11 11 | 00 00 10 10",
     "00 10 00 10 | 00 10 00 10 | 01 11 01 11 | 01 11 01 11"),
    ("00 01 11 10 | 01 00 10 11 | 01 00 10 11 | 00 01 11 10",
     "00 10 01 11 | 00 10 01 11 | 01 11 00 10 | 01 11 00 10"),
    ("00 01 10 11 | 01 00 11 10 | 01 00 11 10 | 00 01 10 11",
     "00 11 01 10 | 00 11 01 10 | 01 10 00 11 | 01 10 00 11"),
    ("00 00 11 11 | 01 01 10 10 | 01 01 10 10 | 00 00 11 11",
     "00 11 00 11 | 00 11 00 11 | 01 10 01 10 | 01 10 01 10"),
]

# three-row d=4 net that admits no further row
NET_D4_INCOMPLETE = [
    ["00 01 02 03", "10 11 12 13", "20 21 22 23", "30 31 32 33"],
    ["00 10 20 30", "01 11 21 31", "02 12 22 32", "03 13 23 33"],
    ["00 11 22 33", "01 12 23 30", "02 13 20 31", "03 10 21 32"],
]


def labels(table, d: int) -> list[list[tuple[int, ...]]]:
    """Decode a transcribed table into integer labels m*d + n."""
    out = []
    for row in table:
        out.append([tuple(int(pair[0]) * d + int(pair[1]) for pair in cell.split()) for cell in row])
    return out
