"""Circuit-level surface-code threshold simulator for exchange-coupled
silicon spin qubits with mediated two-qubit gates."""

__version__ = "0.1.0"
