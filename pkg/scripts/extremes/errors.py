# coding: utf-8
"""
Hierarquia de erros do laboratório de extremos.

Tudo deriva de RuntimeError, como nos scripts do desk; as subclasses só
separam o que a CLI precisa distinguir (exit 2 para configuração).
"""


class ExtremesError(RuntimeError):
    pass


class InputError(ExtremesError, ValueError):
    """Argumento fora da pré-condição (série vazia, p fora de (0,1), ...)."""


class ConfigError(ExtremesError):
    """Configuração de experimento inválida. A CLI devolve exit 2."""


class DomainError(ExtremesError, ValueError):
    """Avaliação fora do suporte de G / intensidade com massa infinita."""
