"""Thin compatibility shim; the real code lives in slls/."""
from slls.cli import app

if __name__ == '__main__':
    app()
