from rfnode.core.module import CONSUME, DROP, NodeModule, UnknownCommandError
from rfnode.core.node import Node
from rfnode.core.queues import BoundedQueue

__all__ = ["CONSUME", "DROP", "NodeModule", "UnknownCommandError", "Node", "BoundedQueue"]
