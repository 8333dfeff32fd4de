"""Gravitational time-dilation dephasing: spectra, visibility, timescales and collisional competition."""
