#!/usr/bin/env node
// Compiles the corpus contracts with solc 0.4.25 and freezes the runtime
// bytecode plus a manifest consumed by the test suites.
//
// Usage: npm install && node build.js

'use strict';

const fs = require('fs');
const path = require('path');
const solc = require('solc');
// The skip-empty-string-literal encoder bug exists only before 0.4.12; the
// corpus entries that depend on it are built with a bug-era compiler.
const solcLegacy = require('solc-sesl');

const SOLC_VERSION = '0.4.25';
const SOLC_LEGACY_VERSION = '0.4.11';

// source file -> entries [{ contract, out, technique }]
// technique: expected detector id, or null for a clean contract.
const PLAN = {
  'multiplicator.sol': [{ contract: 'MultiplicatorX3', out: 'multiplicator', technique: 'BD' }],
  'king_of_the_hill.sol': [{ contract: 'KingOfTheHill', out: 'king_of_the_hill', technique: 'ID' }],
  'dividend_distributor.sol': [{ contract: 'DividendDistributorv3', out: 'dividend_distributor', technique: 'SESL', legacy: true }],
  'for_test.sol': [{ contract: 'For_Test', out: 'for_test', technique: 'TDO' }],
  'guess_number.sol': [{ contract: 'GuessNumber', out: 'guess_number', technique: 'US' }],
  'gift_1_eth.sol': [{ contract: 'Gift_1_ETH', out: 'gift_1_eth', technique: 'HSU' }],
  'test_token.sol': [{ contract: 'TestToken', out: 'test_token', technique: 'HT' }],
  'private_bank.sol': [{ contract: 'Private_Bank', out: 'private_bank', technique: 'SMC' }],
  'firm_wallet.sol': [{ contract: 'FirmWallet', out: 'firm_wallet', technique: 'SMC' }],

  'multiplicator_fixed.sol': [{ contract: 'MultiplicatorX3Fixed', out: 'multiplicator_fixed', technique: null, mutant_of: 'BD' }],
  'king_of_the_hill_fixed.sol': [{ contract: 'KingOfTheHillFixed', out: 'king_of_the_hill_fixed', technique: null, mutant_of: 'ID' }],
  'dividend_distributor_fixed.sol': [{ contract: 'DividendDistributorv3Fixed', out: 'dividend_distributor_fixed', technique: null, mutant_of: 'SESL', legacy: true }],
  'for_test_fixed.sol': [{ contract: 'For_TestFixed', out: 'for_test_fixed', technique: null, mutant_of: 'TDO' }],
  'guess_number_fixed.sol': [{ contract: 'GuessNumberFixed', out: 'guess_number_fixed', technique: null, mutant_of: 'US' }],
  'gift_1_eth_fixed.sol': [{ contract: 'Gift_1_ETHFixed', out: 'gift_1_eth_fixed', technique: null, mutant_of: 'HSU' }],
  'test_token_fixed.sol': [{ contract: 'TestTokenFixed', out: 'test_token_fixed', technique: null, mutant_of: 'HT' }],
  'private_bank_fixed.sol': [{ contract: 'Private_BankFixed', out: 'private_bank_fixed', technique: null, mutant_of: 'SMC' }],

  'synthetics.sol': [
    { contract: 'PiggyBank', out: 'syn_piggy_bank', technique: null },
    { contract: 'Faucet', out: 'syn_faucet', technique: null },
    { contract: 'Splitter', out: 'syn_splitter', technique: null },
    { contract: 'Echo', out: 'syn_echo', technique: null },
    { contract: 'Storugga', out: 'syn_storugga', technique: null },
    { contract: 'SelfDestructor', out: 'syn_self_destructor', technique: null },
    { contract: 'LoopSummer', out: 'syn_loop_summer', technique: null },
    { contract: 'Mapper', out: 'syn_mapper', technique: null },
    { contract: 'TimeLock', out: 'syn_time_lock', technique: null },
    { contract: 'Registry', out: 'syn_registry', technique: null },
  ],
  'gate_checks.sol': [
    { contract: 'Counter', out: 'gate_counter', technique: null },
    { contract: 'Empty', out: 'gate_empty', technique: null },
    { contract: 'Sink', out: 'gate_sink', technique: null },
  ],
  'two_function.sol': [{ contract: 'TwoFn', out: 'two_function', technique: null }],
};

function main() {
  if (!solc.version().includes(SOLC_VERSION)) {
    console.error(`expected solc ${SOLC_VERSION}, got ${solc.version()}`);
    process.exit(1);
  }
  if (!solcLegacy.version().includes(SOLC_LEGACY_VERSION)) {
    console.error(`expected legacy solc ${SOLC_LEGACY_VERSION}, got ${solcLegacy.version()}`);
    process.exit(1);
  }

  const here = __dirname;
  const outDir = path.join(here, 'bytecode');
  fs.mkdirSync(outDir, { recursive: true });

  const manifest = { solc: solc.version(), solc_legacy: solcLegacy.version(), optimizer: false, entries: [] };
  let failed = false;

  for (const [file, entries] of Object.entries(PLAN)) {
    const source = fs.readFileSync(path.join(here, 'contracts', file), 'utf8');
    const legacy = entries.some((e) => e.legacy);
    const compiler = legacy ? solcLegacy : solc;
    const output = compiler.compile(source, 0); // optimizer off
    const errors = (output.errors || []).filter((e) => !/Warning/.test(e));
    if (errors.length) {
      console.error(`${file}: ${errors.join('\n')}`);
      failed = true;
      continue;
    }
    for (const entry of entries) {
      const compiled = output.contracts[`:${entry.contract}`];
      if (!compiled) {
        console.error(`${file}: contract ${entry.contract} not found`);
        failed = true;
        continue;
      }
      const hex = compiled.runtimeBytecode;
      fs.writeFileSync(path.join(outDir, `${entry.out}.hex`), hex + '\n');
      manifest.entries.push({
        name: entry.out,
        source: file,
        contract: entry.contract,
        technique: entry.technique,
        mutant_of: entry.mutant_of || null,
        solc: compiler.version(),
        runtime_bytes: hex.length / 2,
      });
      console.log(`${entry.out}: ${hex.length / 2} bytes`);
    }
  }

  fs.writeFileSync(path.join(here, 'manifest.json'), JSON.stringify(manifest, null, 2) + '\n');
  process.exit(failed ? 1 : 0);
}

main();
