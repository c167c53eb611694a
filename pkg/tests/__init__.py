"""Tests for the paxos_mc package."""
