"""
Jinja2 templates for human-readable verification summaries.
"""

from typing import Dict

from jinja2 import Template

VERIFY_SUMMARY_TEMPLATE = Template("""\
verify n={{ n }} eta={{ eta }} M={{ M }} N={{ N }} seed={{ seed }}
{% for check in checks -%}
{{ "%-26s"|format(check.name) }} {% if check.skipped %}SKIP  {{ check.detail }}{% else %}{{ "PASS" if check.passed else "FAIL" }}  deviation={{ "%.3e"|format(check.deviation) }} threshold={{ "%.1e"|format(check.threshold) }}{% endif %}
{% endfor -%}
result: {{ "PASS" if passed else "FAIL" }}{% if not passed %} ({{ failed|join(", ") }}){% endif %}
""")


class SummaryBuilder:
    """Renders summaries through named Jinja2 templates."""

    def __init__(self):
        self.templates: Dict[str, Template] = {
            "verify": VERIFY_SUMMARY_TEMPLATE,
        }

    def render_template(self, name: str, **kwargs) -> str:
        if name not in self.templates:
            raise ValueError(f"Template '{name}' not found")
        return self.templates[name].render(**kwargs)


summary_builder = SummaryBuilder()
