"""Race orchestration: verdicts, forced unknowns, and batch mode."""

from conftest import BIGON_PD, KINK_PD, TREFOIL_PD
from unknot.diagrams import parse_pd
from unknot.presentation import Presentation, presentation_of
from unknot.runner import batch_decide, decide, prove, refute

FREE_PAIR = Presentation(generators=("a1", "a2"), relations=(),
                         goal=(("a1", "a2"),))


def test_decide_culprit_unknot(culprit_text):
    report = decide(culprit_text, timeout_s=60.0)
    assert report.verdict == "unknot"
    assert report.method == "proof"
    assert report.prover.status == "proved"
    assert report.detail == ""
    assert report.elapsed_s < 60.0


def test_decide_trefoil_knotted(trefoil):
    report = decide(trefoil, timeout_s=60.0)
    assert report.verdict == "knotted"
    assert report.method == "countermodel"
    assert report.finder.status == "found"
    assert report.finder.size == 3


def test_decide_bigon_unknot():
    report = decide(BIGON_PD, timeout_s=30.0)
    assert report.verdict == "unknot" and report.method == "proof"


def test_source_forms_agree(trefoil):
    text_verdict = decide(TREFOIL_PD).verdict
    diagram_verdict = decide(trefoil).verdict
    pres_verdict = decide(presentation_of(trefoil)).verdict
    assert text_verdict == diagram_verdict == pres_verdict == "knotted"


def test_forced_unknown_reports_partial_progress(trefoil):
    # too small a model bound and too small a prover budget: neither engine
    # can answer, but the refuted size is still reported
    report = decide(trefoil, timeout_s=0.05, max_size=2)
    assert report.verdict == "unknown"
    assert report.method is None
    assert report.finder.sizes_refuted == (2,)
    assert report.prover.status == "resource_out"


def test_saturation_alone_decides():
    # an idempotent-only theory saturates finitely; with the model search
    # capped below any separating size, completeness itself is the verdict
    report = decide(FREE_PAIR, timeout_s=30.0, max_size=1, axioms=(1,))
    assert report.verdict == "knotted"
    assert report.method == "saturation"
    assert report.prover.status == "saturated_without_proof"


def test_prove_entry_point(culprit_text):
    out, err = prove(culprit_text, timeout_s=60.0)
    assert out.status == "proved"
    assert err is None


def test_refute_entry_point(trefoil):
    out, err = refute(trefoil, timeout_s=60.0)
    assert out.status == "found"
    assert out.size == 3
    assert err is None


def test_refute_unknot_exhausts():
    out, err = refute(KINK_PD, timeout_s=30.0, max_size=6)
    assert out.status == "exhausted"
    assert out.sizes_refuted == (2, 3, 4, 5, 6)
    assert err is None


def test_report_json_shape():
    blob = decide(KINK_PD, timeout_s=30.0).to_json_dict()
    assert blob["verdict"] == "unknot"
    assert blob["generators"] == ["a1"]
    assert blob["prover"]["status"] == "proved"
    assert isinstance(blob["elapsed_s"], float)


def test_batch_order_and_error_containment():
    items = [("kink", KINK_PD), ("junk", "PD[X(1,2,3)]"),
             ("trefoil", TREFOIL_PD)]
    serial = batch_decide(items, timeout_s=30.0, workers=1)
    assert [name for name, _ in serial] == ["kink", "junk", "trefoil"]
    assert serial[0][1]["verdict"] == "unknot"
    assert serial[1][1]["verdict"] == "error"
    assert serial[2][1]["verdict"] == "knotted"


def test_batch_parallel_matches_serial():
    items = [("kink", KINK_PD), ("bigon", BIGON_PD), ("trefoil", TREFOIL_PD)]
    serial = batch_decide(items, timeout_s=30.0, workers=1)
    parallel = batch_decide(items, timeout_s=30.0, workers=3)
    strip = lambda rows: [(n, r["verdict"], r["method"]) for n, r in rows]
    assert strip(serial) == strip(parallel)
