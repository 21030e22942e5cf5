"""Workflows package."""

