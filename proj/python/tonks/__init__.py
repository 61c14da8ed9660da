"""Tonks-Girardeau gas densities, probe transmission and spectral inversion."""

from ._tonks import *  # noqa: F401,F403
