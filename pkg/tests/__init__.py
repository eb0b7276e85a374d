"""Test suite for the f451_sysid package."""
