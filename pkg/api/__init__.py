"""FastAPI server exposing gabortorus reports."""
