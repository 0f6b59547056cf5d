"""Library code for strata-lab."""
