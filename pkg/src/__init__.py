__version__ = "0.3.0"

# Bumped whenever the certificate JSON layout changes.
CERTIFICATE_SCHEMA = 1
