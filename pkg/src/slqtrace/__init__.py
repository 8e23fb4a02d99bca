"""Exact SL_n quantum traces over Z[hq, hq^-1]."""
