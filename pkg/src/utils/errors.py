"""
Исключения приложения.

Все ошибки входных данных наследуются от ValueError, как и в клиентах
API, чтобы вызывающий код мог перехватывать их одним except.
"""


class DomainError(ValueError):
    """Числовой аргумент вне области определения (отрицательное время, ε вне диапазона и т.п.)."""


class ValidationError(ValueError):
    """Структурно некорректные входные данные: пустой набор, неотсортированная сетка и т.п."""


class DatasetFormatError(ValidationError):
    """Ошибка разбора файла с данными; хранит номер строки."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number
