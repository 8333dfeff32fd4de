"""Shared utilities."""


