from hypothesis import strategies as st

from nclam.trees import PlaneTree


@st.composite
def trees(draw, max_n=60):
    """Random plane trees built by attaching each new vertex below an earlier one."""
    n = draw(st.integers(1, max_n))
    par = [None] + [draw(st.integers(0, i - 1)) for i in range(1, n)]
    kids_of = [[] for _ in range(n)]
    for v in range(1, n):
        kids_of[par[v]].append(v)
    order, stack = [], [0]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(reversed(kids_of[v]))
    return PlaneTree([len(kids_of[v]) for v in order])
