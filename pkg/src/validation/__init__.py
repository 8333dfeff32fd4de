"""Invariant checks over scenarios and traces, used by `report` and the tests."""
