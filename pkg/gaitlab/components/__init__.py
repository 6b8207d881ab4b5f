"""
Figures written by the CLI (detached matplotlib, SVG output)
"""
