"""slls: snake locomotion learning search, a swarm metaheuristic."""

__version__ = "0.1.0"
