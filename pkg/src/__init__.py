# Sign-bound Verifier Package
