"""Deterministic figure rendering for plasmonqe batch output."""

from .render import PanelSpec, RenderReport, render

__all__ = ["PanelSpec", "RenderReport", "render"]
