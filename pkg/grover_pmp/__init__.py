"""Time-optimal control and Pontryagin verification for Grover search on one qubit."""
