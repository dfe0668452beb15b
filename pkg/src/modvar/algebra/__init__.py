"""Presentations, truncated quotients, glueing, catalog recognition and gradings."""
