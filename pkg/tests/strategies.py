from hypothesis import strategies as st

from coloredkh import corpus
from coloredkh.diagram import mirror, switch_crossing

SMALL = ["unknot", "kink", "negative-kink", "double-kink", "hopf", "negative-hopf",
         "r2-unlink", "trefoil", "left-trefoil", "figure-eight"]

exponents = st.integers(-12, 12)
polys_data = st.dictionaries(exponents, st.integers(-50, 50), max_size=6)


@st.composite
def diagrams(draw, names=SMALL):
    d = corpus.get(draw(st.sampled_from(names)))
    if draw(st.booleans()):
        d = mirror(d)
    for x in draw(st.lists(st.sampled_from([x.id for x in d.crossings]), max_size=2)) if d.crossings else []:
        d = switch_crossing(d, x)
    return d
