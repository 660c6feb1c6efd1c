"""Cooperative resource budgets shared by the prover and the model finder.

A budget combines an optional work ceiling (search nodes for the model
finder, kept equations for the prover), an optional term size cap (prover
only), an optional wall clock, and an optional cancellation event (how the
race tells the losing engine to stop).  Engines poll at checkpoints rather
than per step, so the checks must stay cheap.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Optional


@dataclass
class SearchBudget:
    max_nodes: Optional[int] = None
    max_term_size: Optional[int] = None
    wall_s: Optional[float] = None
    cancel: Optional[threading.Event] = None
    _deadline: Optional[float] = field(default=None, repr=False)

    def start(self) -> None:
        if self.wall_s is not None and self._deadline is None:
            self._deadline = time.monotonic() + self.wall_s

    def tripped(self, nodes: int) -> Optional[str]:
        """The limit that work has hit, or None while within budget."""
        if self.cancel is not None and self.cancel.is_set():
            return "cancelled"
        if self.max_nodes is not None and nodes >= self.max_nodes:
            return "nodes"
        if self._deadline is not None and time.monotonic() > self._deadline:
            return "wall"
        return None

    def exhausted(self, nodes: int) -> bool:
        return self.tripped(nodes) is not None
