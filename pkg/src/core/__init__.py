"""Core numerics: spectral operators, kernels, identities, flow and suites."""
