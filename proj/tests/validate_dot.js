// Validates a DOT file via the dotparser package: the file must parse as a
// single digraph containing at least one node statement.
const fs = require('fs');
const parse = require('dotparser');

const path = process.argv[2];
if (!path) {
  console.error('usage: node validate_dot.js <file.dot>');
  process.exit(2);
}

let graphs;
try {
  graphs = parse(fs.readFileSync(path, 'utf8'));
} catch (err) {
  console.error(`DOT parse error: ${err.message}`);
  process.exit(1);
}

if (!Array.isArray(graphs) || graphs.length !== 1) {
  console.error(`expected exactly one graph, got ${graphs ? graphs.length : 0}`);
  process.exit(1);
}
const g = graphs[0];
if (g.type !== 'digraph') {
  console.error(`expected a digraph, got '${g.type}'`);
  process.exit(1);
}

let nodes = 0;
let edges = 0;
const walk = (children) => {
  for (const child of children || []) {
    if (child.type === 'node_stmt') nodes += 1;
    else if (child.type === 'edge_stmt') edges += 1;
    else if (child.type === 'subgraph') walk(child.children);
  }
};
walk(g.children);

if (nodes === 0) {
  console.error('no node statements found');
  process.exit(1);
}
console.log(`ok: digraph with ${nodes} nodes and ${edges} edges`);
