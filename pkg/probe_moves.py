import dataclasses

from unknot.diagrams import parse_pd, serialize_pd, KnotDiagram
from unknot.moves import (apply_move, trace_equations, check_trace_properties,
                          parse_move, MoveError)
from unknot.terms import format_term

KINK = "PD[X(1,2,2,1)]"
TREFOIL = "PD[X(1,4,2,5),X(5,2,6,3),X(3,6,4,1)]"

# 1. circle -> kink under all four wirings, then back down
circle = KnotDiagram((), 1)
for strand in ("under", "over"):
    for sign in ("pos", "neg"):
        k = apply_move(circle, f"RM1_up @ edge 1 {strand} {sign}")
        back = apply_move(k, "RM1_down @ crossing 1")
        print(f"wiring {strand} {sign}: {serialize_pd(k)} -> back "
              f"{len(back.crossings)} crossings, edges={back.edge_count}")

# 2. trefoil negatives
for mv in ("RM1_down @ crossing 1", "RM2_down @ crossings 1,2",
           "RM3 @ crossings 1,2,3"):
    try:
        apply_move(parse_pd(TREFOIL), mv)
        print(f"trefoil {mv}: APPLIED (!)")
    except MoveError as e:
        print(f"trefoil {mv}: MoveError: {e}")

# 3. kink RM2_up then RM2_down restores the serialization?
k = parse_pd(KINK)
up = apply_move(k, "RM2_up @ edges 1,2 under")
print("kink+poke:", serialize_pd(up))
down = apply_move(up, "RM2_down @ crossings 2,3")
print("unpoked:", serialize_pd(down), "| original:", KINK)

# also try over strand
up2 = apply_move(k, "RM2_up @ edges 1,2 over")
print("kink+poke over:", serialize_pd(up2))

# 4. corrupted equation log under axioms=(1,)
tr = trace_equations(parse_pd(KINK), "RM1_up @ edge 1 under pos")
rep = check_trace_properties(tr, axioms=(1,))
print("clean kink+up  (ax1):", rep.ok, rep.steps_proved, rep.steps_failed,
      rep.steps_unverified)
left, right = tr.equations[-1]
print("   last eq:", format_term(left), "=", format_term(right))
tr.equations[-1] = (left, left)
rep = check_trace_properties(tr, axioms=(1,))
print("broken kink+up (ax1):", rep.ok, rep.steps_proved, rep.steps_failed,
      rep.steps_unverified, rep.details)

# 5. corrupt removed_labels bookkeeping
from unknot.terms import const
tr2 = trace_equations(parse_pd(KINK), "RM1_down @ crossing 1")
rep2 = check_trace_properties(tr2)
print("clean kink down:", rep2.ok, rep2.labels_ok)
bad = dataclasses.replace(tr2.records[0], removed_labels=(const("zz"),))
tr2.records[0] = bad
rep2 = check_trace_properties(tr2)
print("bad removed_labels:", rep2.ok, rep2.labels_ok, rep2.details)

# 6. structure corruption: drop the final equation count
tr3 = trace_equations(parse_pd(KINK), "RM1_down @ crossing 1")
tr3.equation_counts[-1] += 1
rep3 = check_trace_properties(tr3)
print("bad counts:", rep3.ok, rep3.structure_ok, rep3.details)

# 7. shape corruption: swap an equation inside the record
tr4 = trace_equations(parse_pd(KINK), "RM1_down @ crossing 1")
l, r = tr4.records[0].equations[0]
tr4.records[0] = dataclasses.replace(tr4.records[0], equations=((l, l),))
rep4 = check_trace_properties(tr4)
print("bad shape:", rep4.ok, rep4.equations_ok, rep4.details)

# 8. RM3 on the poked kink: crossing count stays 3, diagram changes
pk = parse_pd("PD[X(1,5,2,4),X(5,3,6,2),X(6,3,1,4)]")
slid = apply_move(pk, "RM3 @ crossings 1,2,3")
print("RM3 slide:", serialize_pd(slid))

# 9. parse errors
for bad_line in ("RM9 @ crossing 1", "RM1_down crossing 1",
                 "RM1_down @ crossing 1,2", "RM1_up @ edge 1 under",
                 "RM1_up @ edge 1 sideways pos", "RM2_up @ edges 1,2",
                 "RM3 @ crossings 1,2", "RM1_down @", ""):
    try:
        parse_move(bad_line)
        print(f"parse {bad_line!r}: OK (!)")
    except MoveError as e:
        print(f"parse {bad_line!r}: MoveError")

# 10. format round trip for all kinds
for line in ("RM1_down @ crossing 2", "RM1_up @ edge 3 over neg",
             "RM2_up @ edges 1,4 under", "RM2_down @ crossings 5,6",
             "RM3 @ crossings 1,2,3"):
    spec = parse_move(line)
    again = parse_move(spec.format())
    print("round trip:", line, "->", spec.format(), "|", spec == again)
