"""Bounded model checking of the hiding-aware separation logic."""
