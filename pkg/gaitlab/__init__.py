"""
gaitlab: Hildebrand gait prescription, geometric mechanics and static
stability for legged and limbless chains.
"""
__version__ = "0.1.0"
