"""Exact divisor-class calculus on moduli spaces of pointed curves."""
