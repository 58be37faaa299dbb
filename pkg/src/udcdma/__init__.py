"""Overloaded uniquely decodable antipodal CDMA code sets: construction,
verification, decoding, and BER simulation."""

__version__ = "0.1.0"
