"""Erros da geração guiada por cobertura."""

from minilang_testing.exceptions import MiniLangTestingError


class MutationFailedError(MiniLangTestingError):
    """O método de mutação não encontrou ponto aplicável no programa alvo."""

    def __init__(self, method: str, reason: str) -> None:
        """Inicializa o erro.

        Args:
            method: Nome do método de mutação.
            reason: Por que não houve mutação.

        """
        super().__init__(f"{method}: {reason}")
        self.method = method
        self.reason = reason
