/**
 * UI server: static dashboard page plus a thin /api proxy in front of the
 * registry, dealer, controllers, and nodes.  All backend URL knowledge
 * stays on this side; the browser only ever sees /api.
 */
import express, { type Express, type Request, type Response } from 'express';
import path from 'node:path';
import { fileURLToPath } from 'node:url';

import { Backend, BackendError, postJson } from './backend.js';

const DEALER_COMMANDS = new Set([
  'scheme-config',
  'action',
  'init-action',
  'tn-participant-config',
]);
const CONTROLLER_COMMANDS = new Set(['action-request', 'respond-share']);

function sendError(res: Response, err: unknown): void {
  const message = err instanceof Error ? err.message : String(err);
  const code = err instanceof BackendError && err.status ? 502 : 502;
  res.status(code).json({ status: 'error', error: message });
}

export function createApp(registryUrl: string): Express {
  const backend = new Backend(registryUrl);
  const app = express();
  app.use(express.json());

  const publicDir = path.join(path.dirname(fileURLToPath(import.meta.url)), '..', 'public');
  app.use(express.static(publicDir));

  app.get('/api/state', async (_req: Request, res: Response) => {
    try {
      res.json(await backend.aggregateState());
    } catch (err) {
      sendError(res, err);
    }
  });

  app.post('/api/dealer/:cmd', async (req: Request, res: Response) => {
    const cmd = req.params.cmd;
    if (!DEALER_COMMANDS.has(cmd)) {
      res.status(404).json({ status: 'error', error: `unknown dealer command ${cmd}` });
      return;
    }
    try {
      const url = await backend.urlOf('dealer');
      res.json(await postJson(`${url}/command/${cmd}`, req.body));
    } catch (err) {
      sendError(res, err);
    }
  });

  app.get('/api/dealer/audit', async (req: Request, res: Response) => {
    try {
      const url = await backend.urlOf('dealer');
      const qs = new URLSearchParams(req.query as Record<string, string>).toString();
      const resp = await fetch(`${url}/audit${qs ? `?${qs}` : ''}`);
      res.json(await resp.json());
    } catch (err) {
      sendError(res, err);
    }
  });

  app.post('/api/controller/:name/:cmd', async (req: Request, res: Response) => {
    const { name, cmd } = req.params;
    // update-share is the raw share overwrite used to play a compromised
    // controller; it maps to the share-delivery endpoint, not a command
    const target = CONTROLLER_COMMANDS.has(cmd)
      ? `/command/${cmd}`
      : cmd === 'update-share'
        ? '/secret'
        : cmd === 'reset'
          ? '/reset'
          : null;
    if (!target || !name.startsWith('controller-')) {
      res.status(404).json({ status: 'error', error: `unknown controller call ${name}/${cmd}` });
      return;
    }
    try {
      const url = await backend.urlOf(name);
      res.json(await postJson(`${url}${target}`, req.body));
    } catch (err) {
      sendError(res, err);
    }
  });

  app.post('/api/node/:name/reset', async (req: Request, res: Response) => {
    const { name } = req.params;
    if (!name.startsWith('node-')) {
      res.status(404).json({ status: 'error', error: `unknown node ${name}` });
      return;
    }
    try {
      const url = await backend.urlOf(name);
      res.json(await postJson(`${url}/reset`, req.body));
    } catch (err) {
      sendError(res, err);
    }
  });

  app.post('/api/route', async (req: Request, res: Response) => {
    try {
      res.json(await backend.setRoute(req.body));
    } catch (err) {
      sendError(res, err);
    }
  });

  return app;
}
