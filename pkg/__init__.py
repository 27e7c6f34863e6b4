"""
DAG-GRU event detection with seed and split variance studies.
"""

__version__ = "1.0.0"
__author__ = "DAG-GRU Event Detection Team"
