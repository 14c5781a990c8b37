"""Token authentication: tokens are random, stored only as salted-free
SHA-256 digests, and compared in constant time."""

from __future__ import annotations

import hashlib
import hmac
import secrets

from .model import User
from .store import LexiconStore


def hash_token(token: str) -> str:
    return hashlib.sha256(token.encode("utf-8")).hexdigest()


def new_token() -> str:
    return secrets.token_urlsafe(32)


def issue_token(store: LexiconStore, username: str) -> str:
    """Generate and install a fresh token for the user; returns the token
    in clear exactly once."""
    token = new_token()
    store.set_user_token_hash(username, hash_token(token))
    return token


def authenticate(store: LexiconStore, token: str) -> User | None:
    """Resolve a bearer token to a user, or None.

    The digest comparison runs over every user regardless of early
    matches, so timing reveals nothing about which token prefix exists.
    """
    if not token:
        return None
    digest = hash_token(token)
    found = None
    for user in store.users():
        if user.token_hash and hmac.compare_digest(digest, user.token_hash):
            found = user
    return found
