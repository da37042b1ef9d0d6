"""Test suite for spk_app: unit tests per layer plus command line integration tests."""
