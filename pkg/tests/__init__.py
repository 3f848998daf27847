"""Tests for the scoot package."""
