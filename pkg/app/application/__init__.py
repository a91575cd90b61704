"""Application layer containing use cases and report schemas."""
