"""kRSP Solver - k disjoint delay-bounded shortest paths by bicameral cycle cancellation."""

__version__ = "0.1.0"
