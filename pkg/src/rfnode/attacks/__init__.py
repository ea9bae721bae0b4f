from rfnode.attacks.rolljam import RollJamModule
from rfnode.attacks.mousejack import MouseJackModule

__all__ = ["RollJamModule", "MouseJackModule"]
