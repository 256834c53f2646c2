"""ZeroTwo: zero-knowledge user authentication.

A salt-free augmented-PAKE core with a reference HTTP server, a
smartphone-role authenticator CLI, and an adversarial simulation harness.
"""

__version__ = "0.1.0"
