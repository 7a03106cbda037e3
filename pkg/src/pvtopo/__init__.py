"""Directed-topology toolkit for semaphore (PV) programs."""
