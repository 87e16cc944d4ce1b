"""Measurement-free fault-tolerant QEC toolkit for the 9-qubit Bacon-Shor
code: gadget constructors, exhaustive malignant-fault counting, a dense
statevector oracle, and the threshold / error-budget / cooling recursions.
"""

__version__ = "0.1.0"
