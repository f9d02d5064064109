"""Statevector simulator and reversible arithmetic library."""
from .arith import (adder_ancilla, adder_fragment, comparator_ancilla,
                    comparator_fragment, multiplier_ancilla, multiplier_fragment)
from .circuit import (ZERO, CircuitFragment, Control, FragmentError, Gate,
                      controlled, merge_controls, x_gate)
from .statevector import (MAX_QUBITS, CeilingError, Statevector, apply_fragment,
                          marginal_probabilities, measure_counts, new_state)

__all__ = [
    "ZERO", "CircuitFragment", "Control", "FragmentError", "Gate", "controlled",
    "merge_controls", "x_gate", "MAX_QUBITS", "CeilingError", "Statevector",
    "apply_fragment", "marginal_probabilities", "measure_counts", "new_state",
    "adder_fragment", "multiplier_fragment", "comparator_fragment",
    "adder_ancilla", "multiplier_ancilla", "comparator_ancilla",
]
