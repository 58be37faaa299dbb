"""Packaged matrix fixtures (+/- glyph text files)."""
