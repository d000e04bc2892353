"""Test suite for the KN current algebra kernel."""
