import unittest

from rankmetric.infrastructure.engine import Task, TaskGraph


class Doubler:
    def __init__(self, name):
        self.name = name

    def double(self, value):
        return value * 2


class TestTask(unittest.TestCase):

    def setUp(self):
        self.obj = Doubler("doubler")
        self.task = Task(instance=self.obj, method="double", value=10)

    def test_init(self):
        self.assertEqual(self.task.obj, self.obj)
        self.assertEqual(self.task.method, "double")
        self.assertEqual(self.task.kwargs["value"], 10)

    def test_sign_match(self):
        self.assertTrue(self.task.sign_match(obj=self.obj, meth="double", kw_arg=10))
        self.assertFalse(
            self.task.sign_match(obj="NonMatching", meth="double", kw_arg=10)
        )

    def test___str__(self):
        task_str = str(self.task)
        self.assertIn("doubler", task_str)
        self.assertIn("double", task_str)
        self.assertIn("value", task_str)

    def test_run(self):
        result = self.task.run()
        self.assertEqual(result, 20)
        self.assertEqual(self.task.store, 20)

    def test___call__(self):
        result = self.task()
        self.assertEqual(result, 20)


class TestTaskGraph(unittest.TestCase):

    def setUp(self):
        self.graph = TaskGraph()
        self.obj = Doubler("doubler")
        self.task_a = Task(instance=self.obj, method="double", value=10)
        self.task_b = Task(instance=self.obj, method="double", value=20)

    def test_init(self):
        self.assertEqual(self.graph.ntasks, 0)
        self.assertEqual(self.graph.name, "rankmetric.infrastructure.engine.TaskGraph")

    def test_add(self):
        self.graph.add(self.task_a)
        self.assertIn(self.task_a, self.graph.tasks)
        self.assertEqual(self.graph.ntasks, 1)

    def test_add_dependency(self):
        self.graph.add(self.task_a)
        self.graph.add(self.task_b)
        self.graph.add_dependency(
            self.task_b, dep_inst=self.obj, dep_meth="double", dkw=10
        )
        self.assertIn(self.task_a, self.graph.tasks[self.task_b])

    def test_run(self):
        self.graph.add(self.task_a)
        self.graph.run()
        self.assertEqual(self.task_a.store, 20)

    def test___call__(self):
        self.graph.add(self.task_a)
        self.graph()
        self.assertEqual(self.task_a.store, 20)

    def test_run_returns_outputs_in_order(self):
        self.graph.add(self.task_b)
        self.graph.add(self.task_a)
        self.assertEqual(self.graph.run(), [40, 20])

    def test_serial_run_follows_dependencies(self):
        calls = []
        obj = Doubler("doubler")
        obj.double = lambda value: calls.append(value) or value * 2
        late = Task(instance=obj, method="double", value=2)
        early = Task(instance=obj, method="double", value=1)
        self.graph.add(late)
        self.graph.add(early)
        self.graph.add_dependency(late, dep_inst="doubler", dep_meth="double", dkw=1)
        self.assertEqual(self.graph.run(), [4, 2])
        self.assertEqual(calls, [1, 2])


class TestThreadedTaskGraph(unittest.TestCase):

    def test_run_workers(self):
        obj = Doubler("doubler")
        graph = TaskGraph(workers=3)
        tasks = [Task(instance=obj, method="double", value=i) for i in range(10)]
        for task in tasks:
            graph.add(task)
        self.assertEqual(graph.run(), [2 * i for i in range(10)])

    def test_waves_follow_dependencies(self):
        obj = Doubler("doubler")
        graph = TaskGraph(workers=2)
        first = Task(instance=obj, method="double", value=1)
        second = Task(instance=obj, method="double", value=2)
        graph.add(first)
        graph.add(second)
        graph.add_dependency(second, dep_inst=obj, dep_meth="double", dkw=1)
        self.assertEqual(graph._waves(), [[first], [second]])
        self.assertEqual(graph.run(), [2, 4])

    def test_cycle(self):
        obj = Doubler("doubler")
        graph = TaskGraph(workers=2)
        a = Task(instance=obj, method="double", value=1)
        b = Task(instance=obj, method="double", value=2)
        graph.add(a)
        graph.add(b)
        graph.add_dependency(a, dep_inst=obj, dep_meth="double", dkw=2)
        graph.add_dependency(b, dep_inst=obj, dep_meth="double", dkw=1)
        with self.assertRaises(RuntimeError):
            graph.run()


if __name__ == "__main__":
    unittest.main()
