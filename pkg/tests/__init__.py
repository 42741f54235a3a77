"""Tests for the Grundy, Josephus and harness modules."""
