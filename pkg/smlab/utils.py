"""Contains application utils."""

import json
import threading as th

import numpy as np

from .config import config


local = th.local()


class Utils():
    """Represents application utils."""

    def to_json(self, value):
        """Convert numerical value to a JSON compatible object.

        Parameters
        ----------
        value : Any
            Numbers, numpy scalars and arrays, lists and dictionaries.

        Returns
        -------
        output : Any
            Object made of built-in types only. Complex numbers become
            ``[re, im]`` pairs.
        """
        if isinstance(value, dict):
            return {str(k): self.to_json(v) for k, v in value.items()}
        elif isinstance(value, (list, tuple)):
            return [self.to_json(item) for item in value]
        elif isinstance(value, np.ndarray):
            return self.to_json(value.tolist())
        elif isinstance(value, (complex, np.complexfloating)):
            return [float(value.real), float(value.imag)]
        elif isinstance(value, np.integer):
            return int(value)
        elif isinstance(value, np.floating):
            return float(value)
        elif isinstance(value, np.bool_):
            return bool(value)
        return value

    def to_matrix(self, entries, n):
        """Build complex square matrix from row-major ``[re, im]`` pairs.

        Parameters
        ----------
        entries : list
            Row-major list of ``[re, im]`` pairs or plain numbers.
        n : int
            Matrix dimension.

        Returns
        -------
        matrix : numpy.ndarray
            Complex array of shape (n, n).
        """
        values = [complex(*item) if isinstance(item, (list, tuple))
                  else complex(item) for item in entries]
        if len(values) != n*n:
            message = f'{n}x{n} matrix needs {n*n} entries, not {len(values)}'
            raise ValueError(message)
        return np.array(values, dtype=complex).reshape(n, n)

    def dumps(self, value):
        """Serialize value to a deterministic JSON string."""
        return json.dumps(self.to_json(value), sort_keys=True)

    def fit_slope(self, x, y, decades=2):
        """Fit log-log slope over the top decades of the parameter range.

        Parameters
        ----------
        x, y : array_like
            Positive parameters and measured values.
        decades : float, optional
            Width of the fitted range counted down from ``max(x)``.

        Returns
        -------
        slope : float
            Least squares slope of ``log y`` against ``log x``.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        mask = x >= x.max()/10**decades
        if mask.sum() < 2:
            mask = np.ones_like(x, dtype=bool)
        slope, _ = np.polyfit(np.log(x[mask]), np.log(y[mask]), 1)
        return float(slope)

    def parallel(self, function, tasks, name='Worker'):
        """Run function over tasks in named threads, keeping task order.

        Parameters
        ----------
        function : callable
            Called once per task.
        tasks : list
            Task arguments, each passed as the single argument.
        name : str, optional
            Prefix of the worker thread names.

        Calls made from inside a worker run inline, so SMLAB_THREADS bounds
        the threads of the whole process.

        Returns
        -------
        results : list
            Results in the order of ``tasks``.
        """
        tasks = list(tasks)
        results = [None]*len(tasks)
        threads = min(config.threads, len(tasks))
        if threads <= 1 or getattr(local, 'worker', False):
            return [function(task) for task in tasks]
        errors = []
        lock = th.Lock()
        counter = iter(range(len(tasks)))

        def work():
            local.worker = True
            while not errors:
                with lock:
                    index = next(counter, None)
                if index is None:
                    return
                try:
                    results[index] = function(tasks[index])
                except Exception as error:
                    errors.append(error)

        current = th.current_thread()
        workers = []
        for i in range(threads):
            worker_name = f'{current.name}({name}-{i})'
            thread = th.Thread(target=work, name=worker_name, daemon=True)
            thread.start()
            workers.append(thread)
        for thread in workers:
            thread.join()
        if errors:
            raise errors[0]
        return results


utils = Utils()
