from uuis.api.app import SESSION_COOKIE, create_app

__all__ = ["SESSION_COOKIE", "create_app"]
