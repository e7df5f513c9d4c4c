"""Bounded-variable logic on finite graphs: model checking, pebble games,
exact density calculus, terminated-chain gadgets, and a seeded Monte Carlo
harness for their behavior on sparse random graphs."""

__version__ = "0.1.0"
