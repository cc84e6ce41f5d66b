# file: algorithm/api.py
from abc import ABC, abstractmethod


class Decider(ABC):
    """Source of branch choices for XOR- and OR-splits: the workflow control data of a case."""

    @abstractmethod
    def choose(self, definition, state, enabled):
        """
        Must return one element of enabled.choice_domain.
        Only called for elements with more than one possible choice.
        """
        pass
