"""TunerSim test suite."""
