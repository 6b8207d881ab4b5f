"""
Gait generation, contact mechanics, geometric analysis and file I/O
"""
