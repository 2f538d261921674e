"""Command line interface: boot topologies, run scenario scripts, edit routes,
and list audit rows."""
import json
import sys
import time

import click
import requests

from .harness import Topology, TopologyConfig, load_mapping
from .scenario import load_script, normalize_transcript, run_script


@click.group()
def main():
    """S3CDM simulator."""


def _config_from_file(path) -> TopologyConfig:
    if path is None:
        return TopologyConfig()
    with open(path) as fh:
        doc = json.load(fh)
    return TopologyConfig(**doc)


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON topology config file.")
@click.option("--mapping-out", type=click.Path(), default="s3cdm-services.ini",
              help="Where to write the name=url mapping file.")
def up(config_path, mapping_out):
    """Boot an HTTP topology and serve until interrupted."""
    config = _config_from_file(config_path)
    config.in_process = False
    topology = Topology(config).boot()
    topology.write_mapping(mapping_out)
    click.echo(f"topology up: {len(config.all_names)} services; mapping in {mapping_out}")
    for name, url in sorted(topology.registry.urls.items()):
        click.echo(f"  {name} = {url}")
    try:
        while True:
            time.sleep(1)
    except KeyboardInterrupt:
        topology.shutdown()


@main.command()
@click.argument("script_file", type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--transcript-out", type=click.Path(), default=None,
              help="Write the normalized transcript JSON here.")
def scenario(script_file, config_path, transcript_out):
    """Run a JSON scenario script on a fresh in-process topology."""
    config = _config_from_file(config_path)
    topology = Topology(config).boot()
    transcript = run_script(topology, load_script(script_file))
    for step in transcript["steps"]:
        mark = "PASS" if step.get("ok", True) else "FAIL"
        click.echo(f"[{mark}] {step['step']}")
    if transcript_out:
        with open(transcript_out, "w") as fh:
            json.dump(normalize_transcript(transcript), fh, indent=2)
    if not transcript["passed"]:
        sys.exit(1)


def _registry_url(mapping_file) -> str:
    mapping = load_mapping(mapping_file)
    try:
        return mapping["name-registry"]
    except KeyError:
        raise click.ClickException("mapping file has no name-registry entry")


@main.group()
def route():
    """Route configuration against a running topology."""


@route.command("set")
@click.argument("a")
@click.argument("b")
@click.option("--weight", type=int, default=1)
@click.option("--disable", is_flag=True, default=False)
@click.option("--mapping", "mapping_file", type=click.Path(exists=True),
              default="s3cdm-services.ini")
def route_set(a, b, weight, disable, mapping_file):
    """Set the weight / disabled flag of one link."""
    url = _registry_url(mapping_file)
    resp = requests.post(f"{url}/route", json={
        "a": a, "b": b, "weight": weight, "disabled": disable,
    }, timeout=10)
    doc = resp.json()
    if doc.get("status") != "ok":
        raise click.ClickException(doc.get("error", "route update failed"))
    click.echo(f"route {a} <-> {b}: weight={weight} disabled={disable}")


@main.group()
def audit():
    """Audit log access against a running topology."""


@audit.command("list")
@click.option("--batch", default=None)
@click.option("--mapping", "mapping_file", type=click.Path(exists=True),
              default="s3cdm-services.ini")
def audit_list(batch, mapping_file):
    """List recovery audit rows from the dealer."""
    mapping = load_mapping(mapping_file)
    try:
        url = mapping["dealer"]
    except KeyError:
        raise click.ClickException("mapping file has no dealer entry")
    params = {"batch": batch} if batch else {}
    doc = requests.get(f"{url}/audit", params=params, timeout=10).json()
    for row in doc.get("audits", []):
        flag = "ok " if row["is_success"] else "FAIL"
        click.echo(f"{row['id']:>4} [{flag}] {row['reference_number']} "
                   f"{row['request']} {row['context_nodes']}")


if __name__ == "__main__":
    main()
