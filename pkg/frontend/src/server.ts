/** Entry point: `REGISTRY_URL=http://127.0.0.1:8700 node dist/server.js` */
import { createApp } from './app.js';

const registryUrl = process.env.REGISTRY_URL ?? 'http://127.0.0.1:8700';
const port = Number(process.env.PORT ?? 8600);

const app = createApp(registryUrl);
app.listen(port, () => {
  console.log(`dashboard on http://127.0.0.1:${port} (registry ${registryUrl})`);
});
