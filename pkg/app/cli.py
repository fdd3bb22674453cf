"""Console entry point: ``netlab sweep|run|regions|atlas|pos|classify``."""

from flask.cli import FlaskGroup

from app import create_app

cli = FlaskGroup(create_app=create_app, add_default_commands=False, help="Strategic network-formation lab.")

if __name__ == "__main__":
    cli()
