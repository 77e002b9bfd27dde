"""Figure rendering for medsurf sweep CSVs and lattice JSON dumps."""

__version__ = "0.1.0"
