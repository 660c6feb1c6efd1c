"""Decision procedure: race the prover against the countermodel search.

Both engines run concurrently on the same presentation.  A proof of the
triviality chain settles the diagram as an unknot; a verified countermodel,
or saturation without reaching the goal, settles it as knotted.  The first
definitive answer cancels the other engine through its budget's cancel
event.  Every certificate is re-verified by code independent of the search
that produced it before the verdict is reported.
"""

from __future__ import annotations

import os
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .budget import SearchBudget
from .diagrams import KnotDiagram, RelationInput, load_input
from .modelfind import (SearchOutcome, check_model_report,
                        find_minimal_countermodel)
from .presentation import Presentation, presentation_of_input
from .proofcheck import verify_proof_report
from .prover import ALL_AXIOMS, ProveOutcome, saturate

Source = Union[str, Presentation, KnotDiagram, RelationInput]

_PROVER_DEFINITIVE = ("proved", "saturated_without_proof")


@dataclass
class DecisionReport:
    """Verdict plus the raw outcomes of both engines.

    verdict is "unknot", "knotted", or "unknown"; "conflict" flags the
    impossible case of two verified certificates disagreeing, which only a
    bug in an engine could produce.  method names the deciding evidence.
    """

    verdict: str
    method: Optional[str]
    presentation: Presentation
    prover: Optional[ProveOutcome]
    finder: Optional[SearchOutcome]
    elapsed_s: float
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "method": self.method,
            "generators": list(self.presentation.generators),
            "relations": [list(r) for r in self.presentation.relations],
            "prover": self.prover.to_json_dict() if self.prover else None,
            "finder": self.finder.to_json_dict() if self.finder else None,
            "elapsed_s": round(self.elapsed_s, 6),
            "detail": self.detail,
        }


def _as_presentation(source: Source) -> Presentation:
    if isinstance(source, Presentation):
        return source
    if isinstance(source, str):
        source = load_input(source)
    return presentation_of_input(source)


def decide(source: Source, timeout_s: float = 60.0, max_size: int = 24,
           axioms: tuple[int, ...] = ALL_AXIOMS) -> DecisionReport:
    """Race both engines on one input and return a verified verdict."""
    p = _as_presentation(source)
    t0 = time.monotonic()
    cancel_prover = threading.Event()
    cancel_finder = threading.Event()
    outcomes: dict[str, object] = {}

    def prover_job() -> None:
        out = saturate(p, axioms=axioms,
                       budget=SearchBudget(wall_s=timeout_s,
                                           cancel=cancel_prover))
        outcomes["prover"] = out
        if out.status in _PROVER_DEFINITIVE:
            cancel_finder.set()

    def finder_job() -> None:
        out = find_minimal_countermodel(p, axioms=axioms, max_size=max_size,
                                        budget=SearchBudget(wall_s=timeout_s,
                                                            cancel=cancel_finder))
        outcomes["finder"] = out
        if out.status == "found":
            cancel_prover.set()

    threads = [threading.Thread(target=prover_job, daemon=True),
               threading.Thread(target=finder_job, daemon=True)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    prover_out: ProveOutcome = outcomes["prover"]  # type: ignore[assignment]
    finder_out: SearchOutcome = outcomes["finder"]  # type: ignore[assignment]
    elapsed = time.monotonic() - t0

    proof_ok = False
    model_ok = False
    detail = ""
    if prover_out.status == "proved":
        err = verify_proof_report(prover_out, p, axioms=axioms)
        proof_ok = err is None
        if err:
            detail = f"proof rejected: {err}"
    if finder_out.status == "found":
        err = check_model_report(finder_out.model, p, axioms=axioms)
        model_ok = err is None
        if err:
            detail = (detail + "; " if detail else "") + f"model rejected: {err}"

    def report(verdict: str, method: Optional[str]) -> DecisionReport:
        return DecisionReport(verdict=verdict, method=method, presentation=p,
                              prover=prover_out, finder=finder_out,
                              elapsed_s=elapsed, detail=detail)

    if proof_ok and model_ok:
        return report("conflict", None)
    if proof_ok:
        return report("unknot", "proof")
    if model_ok:
        return report("knotted", "countermodel")
    if prover_out.status == "saturated_without_proof":
        # the completed system decides the word problem; the goal is out
        return report("knotted", "saturation")
    return report("unknown", None)


def prove(source: Source, timeout_s: float = 60.0,
          axioms: tuple[int, ...] = ALL_AXIOMS
          ) -> tuple[ProveOutcome, Optional[str]]:
    """Prover only; the second value is the verification error, if any."""
    p = _as_presentation(source)
    budget = SearchBudget(wall_s=timeout_s)
    out = saturate(p, axioms=axioms, budget=budget)
    err = verify_proof_report(out, p, axioms=axioms) \
        if out.status == "proved" else None
    return out, err


def refute(source: Source, timeout_s: float = 60.0, max_size: int = 24,
           axioms: tuple[int, ...] = ALL_AXIOMS
           ) -> tuple[SearchOutcome, Optional[str]]:
    """Countermodel search only, with independent re-verification."""
    p = _as_presentation(source)
    budget = SearchBudget(wall_s=timeout_s)
    out = find_minimal_countermodel(p, axioms=axioms, max_size=max_size,
                                    budget=budget)
    err = check_model_report(out.model, p, axioms=axioms) \
        if out.status == "found" else None
    return out, err


# ------------------------------------------------------------------- batches

def _decide_text(item: tuple[str, str, float, int, tuple[int, ...]]
                 ) -> tuple[str, dict]:
    name, text, timeout_s, max_size, axioms = item
    try:
        report = decide(load_input(text), timeout_s=timeout_s,
                        max_size=max_size, axioms=axioms)
        return name, report.to_json_dict()
    except Exception as e:  # a bad line must not sink the whole batch
        return name, {"verdict": "error", "detail": str(e)}


def batch_decide(items: Iterable[tuple[str, str]], timeout_s: float = 60.0,
                 max_size: int = 24, axioms: tuple[int, ...] = ALL_AXIOMS,
                 workers: Optional[int] = None) -> list[tuple[str, dict]]:
    """Decide many (name, input text) pairs, optionally in parallel.

    workers defaults to the UNKNOT_WORKERS environment variable, then 1.
    Results keep the input order regardless of completion order.
    """
    if workers is None:
        workers = int(os.environ.get("UNKNOT_WORKERS", "1") or "1")
    jobs = [(name, text, timeout_s, max_size, axioms) for name, text in items]
    if workers <= 1 or len(jobs) <= 1:
        return [_decide_text(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_decide_text, jobs))
