import pytest
from hypothesis import strategies as st

from twonested.core import EnrichedMatrix, Row, RowColor, RowLabel

U, L, R, LR = RowLabel.U, RowLabel.L, RowLabel.R, RowLabel.LR
NONE, RED, BLUE = RowColor.NONE, RowColor.RED, RowColor.BLUE


def mat(*rows):
    return EnrichedMatrix.build(rows)


# an LR-orderable enriched matrix with two LR rows and an empty colored LR row
LR_EXAMPLE = mat(("LR", "-", "10001"), ("LR", "-", "11001"), ("U", "-", "01100"),
            ("L", "r", "11100"), ("LR", "b", "00000"), ("R", "b", "00111"))

# not LR-orderable
NON_LR_EXAMPLE = mat(("LR", "-", "10101"), ("L", "r", "11000"), ("R", "b", "00011"), ("U", "-", "00110"))

# an admissible matrix B and its B+ (companion columns for rows 1 and 2 appended last)
ADMISSIBLE_B = mat(("LR", "-", "10000"), ("LR", "-", "11001"), ("LR", "-", "11111"),
              ("U", "-", "01100"), ("L", "r", "11100"), ("LR", "b", "00000"),
              ("R", "b", "00011"))
ADMISSIBLE_B_PLUS = mat(("L", "-", "1000000"), ("L", "-", "1100010"), ("R", "-", "0000110"),
                  ("L", "-", "1110001"), ("R", "-", "0001101"), ("U", "-", "0110000"),
                  ("L", "r", "1110000"), ("R", "b", "0001100"))

# the worked split-graph examples
A_S22_K2 = mat("1100", "1110", "0110", "1000")
A_SPRIME_K2 = mat(("U", "-", "1100"), ("U", "-", "1110"), ("U", "-", "0110"), ("U", "-", "1000"),
                  ("L", "r", "1110"), ("L", "b", "1000"), ("R", "b", "0111"))


@pytest.fixture
def lr_example():
    return LR_EXAMPLE


@st.composite
def enriched_matrices(draw, max_rows=4, max_cols=5, min_cols=0):
    n = draw(st.integers(min_cols, max_cols))
    k = draw(st.integers(0, max_rows))
    empty_lr = draw(st.sampled_from([NONE, RED, BLUE]))
    rows = []
    for _ in range(k):
        bits = tuple(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
        label = draw(st.sampled_from([U, L, R, LR]))
        color = NONE
        if label in (L, R):
            color = draw(st.sampled_from([NONE, RED, BLUE]))
        elif label is LR and not any(bits):
            color = empty_lr
        rows.append(Row(bits, label, color))
    return EnrichedMatrix(n, tuple(rows))


@st.composite
def binary_matrices(draw, max_rows=4, max_cols=5):
    n = draw(st.integers(1, max_cols))
    k = draw(st.integers(0, max_rows))
    rows = [tuple(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))) for _ in range(k)]
    return EnrichedMatrix(n, tuple(Row(r) for r in rows))
