#!/usr/bin/env node
// SMT-LIB v2 pipe server over the Z3 WASM build.
//
// Reads SMT-LIB2 commands from stdin (one command per line), evaluates them
// against a persistent Z3 context, and writes any solver output to stdout.
// The client frames its requests with (echo "marker") commands, which Z3
// echoes back, so no extra protocol is needed on top of SMT-LIB2. The same
// client code can drive a native `z3 -in` process instead.

'use strict';

const readline = require('readline');

async function main() {
  const { init } = require('z3-solver');
  const { Z3 } = await init();
  const cfg = Z3.mk_config();
  const ctx = Z3.mk_context(cfg);

  const rl = readline.createInterface({ input: process.stdin, terminal: false });

  // Commands are evaluated strictly in order; eval_smtlib2_string keeps
  // declarations and assertions in the context until a (reset).
  let queue = Promise.resolve();
  rl.on('line', (line) => {
    queue = queue.then(async () => {
      if (!line.trim()) return;
      let out;
      try {
        out = await Z3.eval_smtlib2_string(ctx, line);
      } catch (err) {
        out = `(error "${String(err).replace(/"/g, "'")}")`;
      }
      if (out && out.trim()) process.stdout.write(out.trim() + '\n');
    });
  });
  rl.on('close', () => {
    queue.then(() => process.exit(0));
  });
}

main().catch((err) => {
  process.stderr.write(`z3pipe: ${err}\n`);
  process.exit(1);
});
