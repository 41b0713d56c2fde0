"""Pendulums dragged along geodesics of constant-curvature surfaces."""
