# tasks/base_task.py

from abc import ABC, abstractmethod

from core.report import TaskResult


class BaseTask(ABC):
    def __init__(self, name: str, actions: tuple):
        """
        Initialise une famille de sous-commandes.

        Args:
            name (str): Nom de la famille (premier mot de la commande).
            actions (tuple): Sous-commandes acceptées.
        """
        self.name = name
        self.actions = actions

    def handles(self, command: str) -> bool:
        words = command.split()
        return bool(words) and words[0] == self.name and (len(words) == 1 or words[1] in self.actions)

    @abstractmethod
    def run(self, problem, action: str, options: dict) -> TaskResult:
        """
        Exécute une sous-commande sur un fichier problème résolu.

        Returns:
            TaskResult: Résultat avec citations et avertissements.
        """
        pass
