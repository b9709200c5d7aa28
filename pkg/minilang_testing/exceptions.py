"""Raiz da hierarquia de erros do framework."""


class MiniLangTestingError(Exception):
    """Erro base de todos os estágios do framework."""


class FrameworkDefectError(MiniLangTestingError):
    """Violação de invariante interna (defeito do próprio framework, não do programa testado)."""


class StageFailureError(MiniLangTestingError):
    """Falha de um estágio do pipeline; carrega o nome do estágio."""

    def __init__(self, stage: str, reason: str) -> None:
        """Inicializa o erro.

        Args:
            stage: Nome do estágio que falhou.
            reason: Descrição curta da falha.

        """
        super().__init__(f"{stage}: {reason}")
        self.stage = stage
        self.reason = reason
