"""Infrastructure layer for files and drawings."""
