"""Core infrastructure: settings, logging, errors, parallel sweeps."""
