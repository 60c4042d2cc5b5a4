"""ellq: exact operator algebra and divisor calculus for q-difference
equations over elliptic function fields, with a high-precision numeric
oracle for cross-validation."""

__version__ = "0.1.0"
