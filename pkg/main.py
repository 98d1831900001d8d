"""Initialize and configure the FastAPI application.

The application exposes the benchmark catalog and the spectrum,
splitting, manifold and verification stages of the construction
under the `/rds` prefix. Run it with `uvicorn main:app`.

This file is part of RandomCenter project.

RandomCenter is free software: you can redistribute it and/or
modify it under the terms of the GNU General Public License as
published by the Free Software Foundation, either version 3 of
the License, or (at your option) any later version.

RandomCenter is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the GNU
General Public License for more details.

You should have received a copy of the GNU General Public License
along with RandomCenter. If not, see <https://www.gnu.org/licenses/>.
"""

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.controllers import rds_router

app = FastAPI(
	title='RandomCenter',
	description='Center manifolds of random dynamical systems.',
	version='0.1.0',
)
app.add_middleware(
	CORSMiddleware,
	allow_origins=['http://localhost:8000', 'http://127.0.0.1:8000'],
	allow_credentials=True,
	allow_methods=['*'],
	allow_headers=['*'],
)
app.include_router(rds_router)


@app.get('/')
def read_root() -> dict:
	"""Return the service name and the available routes."""
	routes = ['catalog', 'spectrum', 'split', 'manifold', 'verify']
	return {'name': app.title, 'routes': [f'/rds/{route}' for route in routes]}
