import itertools, sys
sys.path.insert(0, "src")
from unknot.diagrams import KnotDiagram, serialize_pd
from unknot.construct import rational_knot
from unknot.invariants import determinant
from unknot.moves import (MoveError, apply_move, check_trace_properties,
                          parse_move, parse_moves, trace_equations)
from unknot.portgraph import PortDiagram

# build a 1-crossing kink by applying RM1_up to the circle, all four variants
circle = KnotDiagram((), 1)
for strand in ("under", "over"):
    for sign in ("pos", "neg"):
        tr = trace_equations(circle, f"RM1_up @ edge 1 {strand} {sign}\nRM1_down @ crossing 1")
        assert [len(d.crossings) for d in tr.diagrams] == [0, 1, 0], (strand, sign)
        rep = check_trace_properties(tr)
        print(f"RM1 {strand} {sign} round-trip: ok={rep.ok} proved={rep.steps_proved} "
              f"unv={rep.steps_unverified} details={rep.details}")
        assert rep.ok and not rep.steps_unverified, rep

# plain kink PD codes: also test starting FROM a 1-crossing diagram
kinks = []
for rows in itertools.product(*( [ [(1,2,2,1),(1,1,2,2),(2,1,1,2),(2,2,1,1)] ] )):
    pass
for row in [(1,2,2,1),(1,1,2,2),(2,1,1,2),(2,2,1,1)]:
    try:
        d = KnotDiagram((row,), 2)
        pd = PortDiagram.from_diagram(d)
        pd.walk()
        if pd.is_planar():
            kinks.append(d)
    except Exception:
        pass
print("kink codes found:", [serialize_pd(d) for d in kinks])
for d in kinks:
    tr = trace_equations(d, "RM1_down @ crossing 1")
    assert len(tr.diagrams[-1].crossings) == 0
    rep = check_trace_properties(tr)
    assert rep.ok, rep
print("direct kink removal ok")

# 2-crossing diagrams: enumerate everything, pokes must collapse
bigons = []
for rows in itertools.product(itertools.product((1,2,3,4), repeat=4), repeat=2):
    if sorted(e for row in rows for e in row) != [1,1,2,2,3,3,4,4]:
        continue
    try:
        d = KnotDiagram(rows, 4)
        pd = PortDiagram.from_diagram(d)
        pd.walk()
        if pd.is_planar():
            bigons.append(d)
    except Exception:
        pass
print("2-crossing planar codes:", [serialize_pd(d) for d in bigons])
collapsed = 0
for d in bigons:
    try:
        tr = trace_equations(d, "RM2_down @ crossings 1,2")
    except MoveError as e:
        print("  bigon rejected:", serialize_pd(d), e)
        continue
    assert len(tr.diagrams[-1].crossings) == 0
    rep = check_trace_properties(tr)
    assert rep.ok, rep
    collapsed += 1
print(f"bigon collapse ok on {collapsed} codes")
assert collapsed >= 1

# RM3 on a poked kink, then unwind the three kinks it leaves
tr = trace_equations(circle, "RM1_up @ edge 1 under pos\nRM2_up @ edges 1,2 under\n"
                       "RM3 @ crossings 1,2,3\nRM1_down @ crossing 1\n"
                       "RM1_down @ crossing 1\nRM1_down @ crossing 1")
assert [len(d.crossings) for d in tr.diagrams] == [0, 1, 3, 3, 2, 1, 0]
rep = check_trace_properties(tr)
assert rep.ok and not rep.steps_unverified, rep
print("RM3 slide and unwind ok")

# pattern-not-found errors: no move applies to the alternating trefoil
tre = rational_knot([3])
print("trefoil:", serialize_pd(tre), "det", determinant(tre))
for move in ("RM1_down @ crossing 1", "RM2_down @ crossings 1,2",
             "RM3 @ crossings 1,2,3"):
    try:
        apply_move(tre, move)
        raise AssertionError(f"{move} should fail on the trefoil")
    except MoveError as e:
        assert "pattern-not-found" in str(e), e
        print("trefoil rejection:", e)

# parser round trips
for line in ("RM1_down @ crossing 3", "RM1_up @ edge 2 under pos",
             "RM2_up @ edges 3,7 under", "RM2_down @ crossings 4,7",
             "RM3 @ crossings 1,2,3"):
    assert parse_move(line).format() == line, line
print("parser round trips ok")
print("ALL SMOKE OK")
