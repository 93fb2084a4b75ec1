"""Async engine and sessions for run storage."""

from .session import AsyncSessionLocal, engine, get_session, init_db

__all__ = ["AsyncSessionLocal", "engine", "get_session", "init_db"]
