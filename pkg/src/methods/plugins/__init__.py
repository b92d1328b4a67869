# Method plugins: one module per method id, each exporting `plugin`
