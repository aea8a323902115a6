"""Layered placement of multiple Arabic diacritics."""

from .compose import LayeredCluster, LayeredWord, compose, project_base, split_chains
from .errors import (
    BadBox,
    InconsistentEntry,
    InvalidUtf8,
    LeadingMark,
    MissingMetrics,
    NoSkeletonMapping,
    ParseError,
    TashkilError,
    UnknownMark,
    UnresolvedCollision,
)
from .ingest import Cluster, CodeUnit, DiacritizedWord, lint_order, reorder, segment
from .metrics import GlyphMetrics, MetricsSet, default_metrics, load_metrics
from .pipeline import Shaper, shape_text
from .render import from_json, plans_to_json, to_json, to_svg
from .solver import CollisionPolicy, PlacedGlyph, PlacementPlan, SolverConfig, solve
from .strategies import ComparisonReport, StrategyMode, compare, shape_with
from .taxonomy import Kind, MarkClass, Side, TaxonomyTable, classify, default_table, load_table

__version__ = "0.1.0"
