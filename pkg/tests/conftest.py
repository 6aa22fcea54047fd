# keeps the tests directory importable so tests can share the oracle helpers
