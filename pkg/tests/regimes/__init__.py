"""Test suite for the f451_sysid.regimes sub-package."""
