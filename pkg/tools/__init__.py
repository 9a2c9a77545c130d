"""GraphLARC tools: Lie algebra kernel, interaction graphs, criteria and the CLI."""
