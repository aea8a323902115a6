from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .compose import RasmEntry, compose
from .ingest import DiacritizedWord, segment
from .metrics import MetricsSet, default_metrics
from .solver import PlacementPlan, SolverConfig
from .strategies import StrategyMode, shape_with
from .taxonomy import TaxonomyTable, default_table


@dataclass(frozen=True)
class Shaper:
    """Bundle of the tables a shaping run needs.  Immutable and shareable."""

    taxonomy: TaxonomyTable = field(default_factory=default_table)
    metrics: MetricsSet = field(default_factory=default_metrics)
    config: SolverConfig | None = None
    rasm: Mapping[int, RasmEntry] | None = None
    skeleton: bool = False

    @property
    def cfg(self) -> SolverConfig:
        return self.config or SolverConfig.for_metrics(self.metrics)

    def layered(self, word: DiacritizedWord):
        return compose(word, self.taxonomy, self.skeleton, rasm=self.rasm,
                       kasra_under_shadda=self.cfg.kasra_under_shadda)

    def shape_word(self, word: DiacritizedWord, mode: StrategyMode | str = StrategyMode.LAYERED) -> PlacementPlan:
        return shape_with(mode, self.layered(word), self.metrics, self.cfg)

    def shape(self, text: str | bytes, mode: StrategyMode | str = StrategyMode.LAYERED) -> list[PlacementPlan]:
        return [self.shape_word(w, mode) for w in segment(text)]


def shape_text(text: str | bytes, mode: StrategyMode | str = StrategyMode.LAYERED, **kwargs) -> list[PlacementPlan]:
    return Shaper(**kwargs).shape(text, mode)
