"""Paths to the data files shipped with the package."""

from __future__ import annotations

from importlib import resources


def _path(name: str):
    return resources.files(__package__) / name


def default_library_path():
    return _path("library.json")


def default_bank_path():
    return _path("bank.json")


def default_template_path():
    return _path("template.json")


def default_criteria_path():
    return _path("criteria.json")


def default_checklist_path():
    return _path("checklist.json")


def default_fact_rules_path():
    return _path("fact_rules.json")


def sample_bank_path():
    return _path("sample_bank.json")


def sample_template_path():
    return _path("sample_template.json")
