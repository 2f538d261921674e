import { describe, expect, it } from 'vitest';

import {
  controllerPanel,
  dealerPanel,
  deriveView,
  nodePanel,
  routeTable,
  wrapRows,
} from '../src/viewmodel.js';
import type { AggregateState, ControllerState } from '../src/types.js';

function controllerState(partial: Partial<ControllerState> = {}): ControllerState {
  return {
    status: 'ok',
    name: 'controller-1',
    shares: [],
    solicitations: {},
    statuses: {},
    forward_log: [],
    ...partial,
  };
}

describe('controller panel', () => {
  it('enables raise-hand only on rows where the controller is main', () => {
    const panel = controllerPanel('controller-1', controllerState({
      shares: [
        { from: 'controller-1', to: 'node-2', request: 'R_1', index: 1,
          is_main: true, participants: [], share: 'aa' },
        { from: 'controller-3', to: 'node-2', request: 'R_2', index: 2,
          is_main: false, participants: [], share: 'bb' },
      ],
    }));
    expect(panel.shares.map((s) => s.raiseEnabled)).toEqual([true, false]);
  });

  it('greys out the respond affordance once responded', () => {
    const panel = controllerPanel('controller-5', controllerState({
      solicitations: {
        ref1: { request: 'R_1', responded: false },
        ref2: { request: 'R_2', responded: true },
      },
    }));
    const byRef = Object.fromEntries(panel.responds.map((r) => [r.reference, r]));
    expect(byRef.ref1.respondEnabled).toBe(true);
    expect(byRef.ref2.respondEnabled).toBe(false);
  });

  it('renders an error badge instead of data when the service is down', () => {
    const panel = controllerPanel('controller-2', undefined, 'HTTP 502');
    expect(panel.error).toBe('HTTP 502');
    expect(panel.shares).toEqual([]);
  });
});

describe('node and dealer panels', () => {
  it('lists executions per request entry', () => {
    const panel = nodePanel('node-4', {
      status: 'ok',
      name: 'node-4',
      entries: {
        r1: { request: 'R_3', executed: true, events: [],
          executions: [{ command: 'A_3', status: 'recorded', output: '' }] },
      },
      forward_log: [],
    });
    expect(panel.entries[0].executions).toEqual(['A_3']);
  });

  it('shows unconfigured dealer before a scheme is set', () => {
    const panel = dealerPanel({
      status: 'ok', name: 'dealer', scheme: null, strategy: 'first_n',
      batch_id: null, shares_table: [], actions: [], pending: {}, forward_log: [],
    });
    expect(panel.scheme).toBe('unconfigured');
  });
});

describe('layout and routes', () => {
  it('wraps panels to rows of the given width', () => {
    expect(wrapRows([1, 2, 3, 4, 5, 6, 7], 4)).toEqual([[1, 2, 3, 4], [5, 6, 7]]);
    expect(wrapRows([], 4)).toEqual([]);
  });

  it('keeps the disabled flag on route rows', () => {
    const rows = routeTable([
      { a: 'dealer', b: 'node-2', weight: 1, disabled: true },
      { a: 'controller-1', b: 'dealer', weight: 3, disabled: false },
    ]);
    expect(rows[0]).toEqual({ a: 'controller-1', b: 'dealer', weight: 3, disabled: false });
    expect(rows[1].disabled).toBe(true);
  });

  it('derives a full view with per-section errors isolated', () => {
    const agg: AggregateState = {
      graph: { vertices: [], urls: {}, edges: [] },
      dealer: { error: 'down' },
      controllers: { 'controller-1': { state: controllerState() } },
      nodes: {},
    };
    const view = deriveView(agg);
    expect(view.dealer.error).toBe('down');
    expect(view.controllerRows[0][0].name).toBe('controller-1');
  });
});
