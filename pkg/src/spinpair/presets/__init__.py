"""Packaged figure presets: YAML run and sweep configs loaded by the CLI."""
