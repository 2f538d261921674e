/** Boots the backend topology (real HTTP services) and the UI server for
 * integration tests. */
import { spawn, type ChildProcess } from 'node:child_process';
import type { Server } from 'node:http';
import type { AddressInfo } from 'node:net';

import { createApp } from '../src/app.js';

const BOOT_SCRIPT = `
import signal
from s3cdm.harness import Topology, TopologyConfig
t = Topology(TopologyConfig(in_process=False, base_port=0, seed=7)).boot()
print("REGISTRY " + t.registry.urls["name-registry"], flush=True)
signal.pause()
`;

export interface Stack {
  registryUrl: string;
  uiUrl: string;
  child: ChildProcess;
  server: Server;
}

export async function bootStack(): Promise<Stack> {
  const child = spawn('python3', ['-u', '-c', BOOT_SCRIPT], {
    stdio: ['ignore', 'pipe', 'inherit'],
  });
  const registryUrl = await new Promise<string>((resolve, reject) => {
    const timeout = setTimeout(() => reject(new Error('backend boot timed out')), 20_000);
    let buffer = '';
    child.stdout!.on('data', (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/REGISTRY (\S+)/);
      if (match) {
        clearTimeout(timeout);
        resolve(match[1]);
      }
    });
    child.on('exit', (code) => reject(new Error(`backend exited early (${code})`)));
  });

  const app = createApp(registryUrl);
  const server = await new Promise<Server>((resolve) => {
    const s = app.listen(0, '127.0.0.1', () => resolve(s));
  });
  const { port } = server.address() as AddressInfo;
  return { registryUrl, uiUrl: `http://127.0.0.1:${port}`, child, server };
}

export async function stopStack(stack: Stack): Promise<void> {
  await new Promise<void>((resolve) => stack.server.close(() => resolve()));
  stack.child.kill('SIGTERM');
}

export async function apiGet<T>(stack: Stack, path: string): Promise<T> {
  const resp = await fetch(`${stack.uiUrl}${path}`);
  return (await resp.json()) as T;
}

export async function apiPost<T>(stack: Stack, path: string, body: unknown): Promise<T> {
  const resp = await fetch(`${stack.uiUrl}${path}`, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
  });
  return (await resp.json()) as T;
}

export const FOUR_ROW_TABLE = [
  '| From | To | Level | Request | Action |',
  '| 1 | 2 | 2 | R_1 | A_1 |',
  '| 3 | 2 | 2 | R_2 | A_2 |',
  '| 3 | 2 | 2 | R_3 | A_3 |',
  '| 2 | 1 | 2 | R_4 | A_4 |',
].join('\n');
